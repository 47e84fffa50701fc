"""
Tests for the Django admin modifications.
"""
from django.contrib.auth import get_user_model
from django.test import Client, TestCase
from django.urls import reverse

from core import models


class AdminSiteTests(TestCase):
    """Test for Django admin site"""

    def setUp(self):
        """Create user, client and a recorded experiment."""
        self.client = Client()
        self.admin_user = get_user_model().objects.create_superuser(
            username='admin',
            email='admin@example.com',
            password='password123',
        )
        self.client.force_login(self.admin_user)
        self.experiment = models.Experiment.objects.create(
            model='bpr-hft', category='text-as-regularizer',
            config_hash='f00dcafe', split_hash='split1',
        )
        models.EvalRecord.objects.create(
            experiment=self.experiment, k=10, m=1000, hit_rate=0.25,
            ndcg=0.125, n_users=40,
        )

    def test_experiments_listed(self):
        """Test that experiments are listed on the experiment page."""
        url = reverse('admin:core_experiment_changelist')
        res = self.client.get(url)

        self.assertContains(res, self.experiment.model)
        self.assertContains(res, self.experiment.config_hash)

    def test_edit_experiment_page(self):
        """Test that the experiment page shows its evaluations."""
        url = reverse('admin:core_experiment_change',
                      args=[self.experiment.id])
        res = self.client.get(url)

        self.assertEqual(res.status_code, 200)
        self.assertContains(res, '0.125')

    def test_evaluations_listed(self):
        """Test that evaluation records are listed."""
        url = reverse('admin:core_evalrecord_changelist')
        res = self.client.get(url)

        self.assertEqual(res.status_code, 200)
        self.assertContains(res, 'bpr-hft (f00dcafe)')
